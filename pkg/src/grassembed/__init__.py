"""Isometric embeddings between Grassmann graphs over finite fields."""

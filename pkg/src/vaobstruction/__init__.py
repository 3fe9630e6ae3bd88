"""Exact obstruction theory for assembling graded vertex-algebra-like structures."""

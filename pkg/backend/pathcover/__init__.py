"""Cobertura aproximada por caminos de al menos 4 vertices (ratio ~1.874)."""

"""Conway circle constructions for triangles and tangential polygons."""

__version__ = "0.1.0"

"""Domain services: plane kernel, tangential polygons, Conway constructions, verification."""

"""HTTP surface and domain services for Conway circle constructions."""

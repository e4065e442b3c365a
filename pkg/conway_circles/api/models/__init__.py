"""Pydantic documents exchanged by the CLI and the HTTP routes."""

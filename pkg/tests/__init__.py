"""Tests package - Unit and integration tests."""

"""Tests for WeylSteer."""

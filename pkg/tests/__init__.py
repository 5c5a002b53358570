"""Tests for hom-twist."""

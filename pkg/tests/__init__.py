"""Tests for the bubble_casimir package."""

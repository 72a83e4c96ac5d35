"""Tests for aiida-esomit."""

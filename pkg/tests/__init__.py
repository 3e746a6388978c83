"""Test suite for GenAI Learning Assistant."""

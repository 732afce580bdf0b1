"""Tests package for stt-kernel."""

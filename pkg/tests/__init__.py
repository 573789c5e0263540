"""Test package for Claude Chat API."""
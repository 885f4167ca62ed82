"""
Test package for hds-fallcast.

This package contains unit, property and integration tests for the hds-fallcast library.
"""

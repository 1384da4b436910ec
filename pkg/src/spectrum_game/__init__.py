"""Spectrum sharing game between two random-access wireless networks."""

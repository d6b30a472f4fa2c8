"""Stretch Lens: stretch factors, train-track folding and entropy on rational cones, from the command line."""

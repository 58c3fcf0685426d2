"""Geodesic closures via sampled outerplanar spanning subgraphs."""

from geocore._backend import COMPILED

__version__ = "0.1.0"

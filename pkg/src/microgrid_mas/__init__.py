"""Sizing of an islanded PV / hydrogen / PHEV-station office microgrid.

Hourly dispatch runs through a five-agent protocol; component sizes are
chosen by particle swarm optimization at minimum net present cost.
"""

__version__ = "0.1.0"

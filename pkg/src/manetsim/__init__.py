"""Deterministic discrete-event MANET simulator.

Compares classic ad-hoc routing protocols (AODV, DSDV, OLSR) under
sub-6 GHz omnidirectional and millimeter-wave directional radio
configurations: path-loss models, SINR-threshold reception, random
waypoint mobility, delivery-ratio and transmit-energy metrics.
"""

__version__ = "0.1.0"

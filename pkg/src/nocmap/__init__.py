"""Mapping applications onto mesh networks-on-chip with communication dependences and computation times."""

from .model import (END, START, Cdcg, Core, Cwg, Mapping, Mesh, ModelError, NocParams, Packet,
                    cwg_from_cdcg, validate_cdcg)
from .routing import hop_count, xy_route
from .sim import SimReport, simulate

__version__ = "0.1.0"

__all__ = [
    "START", "END", "Core", "Packet", "Cwg", "Cdcg", "Mesh", "Mapping", "NocParams", "ModelError",
    "cwg_from_cdcg", "validate_cdcg", "xy_route", "hop_count", "SimReport", "simulate",
]

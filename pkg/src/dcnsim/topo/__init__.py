from dcnsim.topo.base import (
    DEFAULT_HOP_DELAY,
    DEFAULT_LINK_RATE,
    Topology,
    ValidationReport,
    concentration_for_oversubscription,
)
from dcnsim.topo.dragonfly import build_dragonfly
from dcnsim.topo.fattree import build_fat_tree
from dcnsim.topo.hyperx import build_hyperx
from dcnsim.topo.jellyfish import build_jellyfish
from dcnsim.topo.slimfly import build_slim_fly
from dcnsim.topo.xpander import build_xpander

__all__ = [
    "DEFAULT_HOP_DELAY",
    "DEFAULT_LINK_RATE",
    "Topology",
    "ValidationReport",
    "concentration_for_oversubscription",
    "build_dragonfly",
    "build_fat_tree",
    "build_hyperx",
    "build_jellyfish",
    "build_slim_fly",
    "build_xpander",
]

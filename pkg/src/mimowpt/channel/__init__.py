"""Channel generation and persistence."""

from mimowpt.channel.rician import (
    ChannelMatrix,
    ChannelMeta,
    as_gain_matrix,
    gram_matrix,
    path_loss_db,
    los_component,
    realization_seed,
    generate_rician,
)
from mimowpt.channel.io import (
    format_complex,
    parse_complex,
    format_vector,
    parse_vector,
    dumps_channel,
    loads_channel,
    save_channel,
    load_channel,
)

__all__ = [
    "ChannelMatrix",
    "ChannelMeta",
    "as_gain_matrix",
    "gram_matrix",
    "path_loss_db",
    "los_component",
    "realization_seed",
    "generate_rician",
    "format_complex",
    "parse_complex",
    "format_vector",
    "parse_vector",
    "dumps_channel",
    "loads_channel",
    "save_channel",
    "load_channel",
]

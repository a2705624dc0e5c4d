"""Log-gradient image preprocessing with a small deterministic CNN core.

Thin Python surface over the C++ extension module `_loggrad`.
"""

# Installed wheels place the extension inside the package; development
# builds leave it at the top level of the build tree.
try:
    from ._loggrad import (
        demosaic_to_gray,
        gamma_encode,
        load_pgm,
        log_gradient,
        log_transform,
        prepare_input,
        quantize,
        rdc_quantize,
        save_pgm,
        scale_brightness,
        synth_scene,
    )
except ImportError:
    from _loggrad import (
        demosaic_to_gray,
        gamma_encode,
        load_pgm,
        log_gradient,
        log_transform,
        prepare_input,
        quantize,
        rdc_quantize,
        save_pgm,
        scale_brightness,
        synth_scene,
    )

__all__ = [
    "demosaic_to_gray",
    "gamma_encode",
    "load_pgm",
    "log_gradient",
    "log_transform",
    "prepare_input",
    "quantize",
    "rdc_quantize",
    "save_pgm",
    "scale_brightness",
    "synth_scene",
]

"""Local Basis latent geometry for piecewise-affine mapping networks."""

import json

from ._core import *  # noqa: F401,F403
from ._core import warpage_suite_json


def warpage_suite(net, k_values, **kwargs):
    """Warpage report as a dict (see ``warpage_suite_json`` for the arguments)."""
    return json.loads(warpage_suite_json(net, k_values, **kwargs))

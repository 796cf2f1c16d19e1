"""Shared builders for the experiment-level tests."""

import numpy as np

from povmkit import AspectConfig, bell_state

TSIRELSON_ANGLES = (0.0, np.pi / 4, np.pi / 8, 3 * np.pi / 8)
TSIRELSON = 2.0 * np.sqrt(2.0)


def make_config(gamma1, gamma2, state=None, angles=TSIRELSON_ANGLES):
    return AspectConfig(
        gamma1=gamma1,
        gamma2=gamma2,
        theta1=angles[0],
        theta1p=angles[1],
        theta2=angles[2],
        theta2p=angles[3],
        state=bell_state() if state is None else state,
    )

"""Printed closed forms against the verified constructions"""

import numpy as np
import pytest

from darbouxembed.geometry.errata import (
    ERRATA_FLAGS,
    detect_errata,
    errata_details,
    iota0_mismatch,
    pq_to_uv_factor,
)
from darbouxembed.geometry.superposition import printed_uv_from_generators
from darbouxembed.models.curves import GeneratorPair


def test_uv_factor_is_root_two():
    # p0 = 1, q0 = 2 at F = p^3/48, G = q^3/3, so u = 1 while the printed form gives 2^(-1/2)
    factor = pq_to_uv_factor()
    assert factor['u'] == pytest.approx(1.0)
    assert factor['u_printed'] == pytest.approx(2 ** -0.5)
    assert factor['ratio'] == pytest.approx(np.sqrt(2.0))


def test_printed_u_is_vectorised():
    pair = GeneratorPair.constant(1.0, 2.0)
    u = printed_uv_from_generators(pair, np.array([0.0, 0.5]), np.array([1.0, 1.5]))
    assert u.shape == (2,)
    assert np.all(u > 0)


def test_constant_generator_mismatch():
    values = iota0_mismatch()
    assert values['x1'] == pytest.approx(13 / 6)
    assert values['x1_printed'] == pytest.approx(25 / 24)


def test_every_flag_reproduced():
    flags = detect_errata()
    assert tuple(flags) == ERRATA_FLAGS
    assert all(flags.values())


def test_details_are_copies():
    details = errata_details()
    details['pq_to_uv_factor']['flag'] = False
    assert errata_details()['pq_to_uv_factor']['flag'] is True
    assert details['ode_sys_sign']['printed_error'] < 1e-6

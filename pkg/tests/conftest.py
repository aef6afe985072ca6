import math

import numpy as np
import pytest

from hypdiskpy.expr import Node, builtin


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def example1() -> Node:
    return builtin("example1", a=0.5)


@pytest.fixture
def example2() -> Node:
    return builtin("example2", a=0.5)


@pytest.fixture
def example3() -> Node:
    return builtin("example3", theta=math.pi / 4)


@pytest.fixture
def example4() -> Node:
    return builtin("example4", c=0.6)


@pytest.fixture
def mobius() -> Node:
    return builtin("mobius", a_re=0.3, a_im=-0.2, theta=0.7)

import pytest

from hochschild.fixtures import (
    fix_d,
    fix_dd,
    fix_ext,
    fix_k,
    fix_kb,
    fix_p3,
)


@pytest.fixture
def named_instances():
    return {
        "FIX-K": fix_k(),
        "FIX-D": fix_d(),
        "FIX-DD": fix_dd(),
        "FIX-P3": fix_p3(),
        "FIX-KB": fix_kb(),
        "FIX-EXT": fix_ext(),
    }

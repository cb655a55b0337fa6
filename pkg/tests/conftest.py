import functools

import pytest

from zklaims import circuit, snark
from zklaims.issuer import IssuerKeypair, new_schema


@functools.lru_cache(maxsize=None)
def issuer(tag="default"):
    # deterministic per tag so that separate fixtures share keys
    import hashlib

    return IssuerKeypair.from_secret(hashlib.sha256(b"test-issuer|" + tag.encode()).digest())


@functools.lru_cache(maxsize=None)
def keys(m: int):
    """Seeded (pk, vk) for an m-payload system, built once per session."""
    desc = circuit.build_constraint_system(m)
    return snark.setup(desc, rng_seed=bytes([m]) * 32)


@functools.lru_cache(maxsize=None)
def schema(m: int):
    kp = issuer()
    return new_schema(kp.issuer_id, [f"attr{i}" for i in range(5 * m - 1)], payload_count=m, schema_id=f"test-schema-{m}")


@pytest.fixture(scope="session")
def kp():
    return issuer()


@pytest.fixture(scope="session")
def keys1():
    return keys(1)


@pytest.fixture(scope="session")
def keys2():
    return keys(2)


@pytest.fixture(scope="session")
def schema1():
    return schema(1)


@pytest.fixture(scope="session")
def schema2():
    return schema(2)

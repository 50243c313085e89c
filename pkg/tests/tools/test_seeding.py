from leafcomm.tools.seeding import DEFAULT_SEED, make_rng, random_bits, seed_sequence, spawn_rngs


def test_make_rng_01():
    first = make_rng(5, "suite", "calculators").integers(0, 1 << 30, size=8)
    again = make_rng(5, "suite", "calculators").integers(0, 1 << 30, size=8)
    other = make_rng(5, "suite", "learning_parity").integers(0, 1 << 30, size=8)
    assert first.tolist() == again.tolist()
    assert first.tolist() != other.tolist()
    assert seed_sequence(None).entropy == DEFAULT_SEED
    assert seed_sequence(3, "cli", 2).spawn_key == seed_sequence(3, "cli", 2).spawn_key


def test_spawn_rngs_01():
    children = spawn_rngs(make_rng(1, "spawn"), 3)
    draws = [child.integers(0, 1 << 30) for child in children]
    assert len(set(draws)) == 3
    repeated = [child.integers(0, 1 << 30) for child in spawn_rngs(make_rng(1, "spawn"), 3)]
    assert draws == repeated


def test_random_bits_01():
    rng = make_rng(2, "bits")
    assert random_bits(rng, 0) == 0
    assert random_bits(rng, -3) == 0
    values = [random_bits(rng, 70) for _ in range(20)]
    assert all(0 <= value < 1 << 70 for value in values)
    assert any(value >= 1 << 64 for value in values)
    assert {random_bits(rng, 1) for _ in range(50)} == {0, 1}

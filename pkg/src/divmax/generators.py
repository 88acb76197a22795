"""Instance generators: two-community benchmarks, random exposure, and
subset-sum hardness instances.

All generators are pure functions of their arguments including the seed.
"""

import numpy as np

from .errors import InvalidProbabilityError, NonPositiveInputError
from .graph import Instance, build_graph
from .rng import stream


def _sample_pair_codes(rng, total: int, count: int) -> np.ndarray:
    """`count` distinct integers from [0, total)."""
    if count <= 0:
        return np.empty(0, dtype=np.int64)
    if 2 * count >= total:
        # dense regime: rejection would crawl, so shuffle the full range
        return np.sort(rng.permutation(total)[:count]).astype(np.int64)
    # sparse regime: draw with replacement and top up collisions, never
    # materializing the (possibly huge) range
    chosen = np.unique(rng.integers(0, total, size=count))
    while chosen.size < count:
        extra = rng.integers(0, total, size=count - chosen.size)
        chosen = np.unique(np.concatenate([chosen, extra]))
    return chosen[:count]


def _decode_triangular(codes: np.ndarray, block: int):
    """Map codes in [0, C(block, 2)) to pairs (i, j) with i < j."""
    c = codes.astype(np.float64)
    i = np.floor((2 * block - 1 - np.sqrt((2 * block - 1) ** 2 - 8 * c)) / 2).astype(np.int64)
    offset = i * (2 * block - i - 1) // 2
    j = (codes - offset + i + 1).astype(np.int64)
    # guard against float rounding at block boundaries
    wrong = j <= i
    if np.any(wrong):
        i[wrong] -= 1
        offset = i[wrong] * (2 * block - i[wrong] - 1) // 2
        j[wrong] = codes[wrong] - offset + i[wrong] + 1
    return i, j


def gen_two_community(n: int, p_in: float, p_out: float, seed: int = 0) -> Instance:
    """Two equal blocks with independent intra/inter edge probabilities.

    Unit weights and unit costs; exposure +1 on the first block, -1 on the
    second.  The budget defaults to 0 (set `Instance.budget` or rebuild for
    a specific k).  Edge counts are drawn per block pair, then positions
    uniformly, which scales to large n.
    """
    if n < 2 or n % 2:
        raise InvalidProbabilityError("n must be an even integer >= 2")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise InvalidProbabilityError("need 0 <= p_out <= p_in <= 1")
    half = n // 2
    rng = stream(seed, "two-community")

    triples = []
    intra_pairs = half * (half - 1) // 2
    for block_start in (0, half):
        count = int(rng.binomial(intra_pairs, p_in)) if intra_pairs else 0
        codes = _sample_pair_codes(rng, intra_pairs, count)
        i, j = _decode_triangular(codes, half)
        triples.extend(zip((i + block_start).tolist(), (j + block_start).tolist()))
    inter_pairs = half * half
    count = int(rng.binomial(inter_pairs, p_out)) if inter_pairs else 0
    codes = _sample_pair_codes(rng, inter_pairs, count)
    i = (codes // half).astype(np.int64)
    j = (codes % half).astype(np.int64) + half
    triples.extend(zip(i.tolist(), j.tolist()))

    graph = build_graph([(i, j, 1.0) for i, j in triples], n=n)
    exposure = np.concatenate([np.ones(half), -np.ones(half)])
    return Instance(graph, exposure, np.ones(n), 0.0)


def gen_random_exposure(inst: Instance, seed: int = 0) -> Instance:
    """Same graph, exposure resampled uniformly from {-1, +1} per node."""
    rng = stream(seed, "random-exposure")
    exposure = rng.choice(np.array([-1.0, 1.0]), size=inst.n)
    return Instance(inst.graph, exposure, inst.costs.copy(), inst.budget,
                    node_ids=inst.node_ids)


def gen_subsetsum(item_weights, target: int) -> Instance:
    """Star-graph instance whose optimum is 1 exactly when some subset of
    `item_weights` sums to `target`, and 0 otherwise.

    Center node 0 connects to one leaf per item with edge weight -m_i, plus
    a final leaf whose edge weight sum(m) + 1 - target pins the center's
    diagonal; that leaf's cost target + 1 makes selecting it infeasible.
    Costs are (0, m_1..m_n, target + 1) with budget `target` and all-ones
    exposure.
    """
    items = [int(m) for m in item_weights]
    if not items or any(m <= 0 for m in items) or int(target) <= 0:
        raise NonPositiveInputError("item weights and target must be positive integers")
    target = int(target)
    total = sum(items)
    n_items = len(items)
    triples = [(0, i + 1, -float(m)) for i, m in enumerate(items)]
    triples.append((0, n_items + 1, float(total + 1 - target)))
    graph = build_graph(triples, n=n_items + 2)
    exposure = np.ones(n_items + 2)
    costs = np.array([0.0] + [float(m) for m in items] + [float(target + 1)])
    return Instance(graph, exposure, costs, float(target))


def subsetsum_dp(item_weights, target: int) -> bool:
    """Independent dynamic-programming oracle: can a subset hit the target?"""
    reachable = 1  # bitset of achievable sums
    for m in item_weights:
        reachable |= reachable << int(m)
    return bool((reachable >> int(target)) & 1)

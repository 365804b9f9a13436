import enum


class FamilyTypes(enum.Enum):
    """
    Families of subgraphs a packing assigns weights to, and whether all members share one vertex count.

    A support element is a vertex set V; the subgraph it stands for is the host induced on V.

    Attributes:
        clique: Copies of K_q^r (all r-subsets of V are host edges).
        big_clique: Cliques with at least rq vertices, produced by the matching sampler.
        induced_k_set: Induced k-vertex subgraphs, produced by the uniform sampler.
    """

    clique = ("K_q clique", True)
    big_clique = ("big clique size >= rq", False)
    induced_k_set = ("induced k-set", True)

    def __init__(self, readable_name: str, uniform_size: bool):
        self.readable_name = readable_name
        self.uniform_size = uniform_size


class StrategyTypes(enum.Enum):
    """
    Pipeline strategies and whether they need caller supplied k and m.

    Attributes:
        paper_constants: Constants of the main theorem, fails cleanly when vacuous.
        empirical: Caller supplied k and m, inner decompositions by the matching constructions.
        lp_fallback: Caller supplied k and m, inner decompositions by the LP oracle.
    """

    paper_constants = ("paper-constants", False)
    empirical = ("empirical", True)
    lp_fallback = ("lp-fallback", True)

    def __init__(self, readable_name: str, needs_k_m: bool):
        self.readable_name = readable_name
        self.needs_k_m = needs_k_m

    @classmethod
    def from_name(cls, name: str) -> "StrategyTypes":
        for member in cls:
            if member.readable_name == name or member.name == name:
                return member
        raise ValueError(f"unknown strategy {name!r}")

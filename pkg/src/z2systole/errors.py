class DegeneratePairingError(ValueError):
    """The cup-product pairing H^k x H^{n-k} -> Z/2 is not perfect."""

    def __init__(self, k: int, shape: tuple[int, int], rank: int):
        self.k = k
        self.shape = shape
        self.rank = rank
        super().__init__(f"pairing in degree {k} has shape {shape} and rank {rank}; no Poincaré duality")


class LemmaViolation(AssertionError):
    """A statement that must hold on every input failed; carries the offending instance."""

    def __init__(self, lemma: str, detail: str):
        self.lemma = lemma
        self.detail = detail
        super().__init__(f"{lemma}: {detail}")

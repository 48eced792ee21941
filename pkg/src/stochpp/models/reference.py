from ..distributions import normal_logpdf
from ..model import Model


class StdNormal(Model):
    """Independent standard normals; a sampler test target."""

    def __init__(self, dim=1):
        self.dim = dim

    def dimension(self):
        return self.dim

    def observe(self, x, tape, rng=None):
        lp = 0.0
        for xi in x:
            lp = lp + normal_logpdf(0.0, 1.0, xi)
        return lp

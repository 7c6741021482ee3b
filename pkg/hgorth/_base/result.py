import numpy as np


class OrthantResult(object):
    r"""Result type.

    probability equals exp(log_prefactor) * g_value, except that a value above 1 by less
    than the integration error is reported as 1.

    residual_norm checks the recurrence algebra of the final state; it vanishes for any
    state and does not measure integration error. refinement_change, the relative
    change of g_value under halved tolerances, does. It is None when no second run was
    made.
    """

    __slots__ = (
        "probability",
        "g_value",
        "log_prefactor",
        "steps",
        "rejected_steps",
        "residual_norm",
        "path_info",
        "elapsed_seconds",
        "config",
        "signs",
        "refinement_change",
    )

    def __init__(
        self,
        probability,
        g_value,
        log_prefactor,
        steps,
        rejected_steps,
        residual_norm,
        path_info,
        elapsed_seconds,
        config,
        signs=None,
        refinement_change=None,
    ):
        self.probability = probability
        self.g_value = g_value
        self.log_prefactor = log_prefactor
        self.steps = steps
        self.rejected_steps = rejected_steps
        self.residual_norm = residual_norm
        self.path_info = path_info
        self.elapsed_seconds = elapsed_seconds
        self.config = config
        self.signs = signs
        self.refinement_change = refinement_change

    def __float__(self):
        return float(self.probability)

    def __str__(self):
        return "{}({!r})".format(self.__class__.__name__, self.probability)

    def __repr__(self):
        return "{}({})".format(
            self.__class__.__name__,
            ", ".join("{}={!r}".format(k, getattr(self, k)) for k in self.__slots__),
        )

    def asdict(self, timing=True):
        r"""Convert to result document.

        Parameters:
            timing(bool): write elapsed_seconds, otherwise 0

        Returns:
            dict

        """
        d = {
            "probability": self.probability,
            "g_value": self.g_value,
            "log_prefactor": self.log_prefactor,
            "steps": self.steps,
            "rejected_steps": self.rejected_steps,
            "residual_norm": self.residual_norm,
            "elapsed_seconds": self.elapsed_seconds if timing else 0.0,
            "config": self.config.to_json(),
            "path": self.path_info,
            "refinement_change": self.refinement_change,
        }

        if self.signs is not None:
            d["signs"] = [int(s) for s in np.asarray(self.signs)]

        return d

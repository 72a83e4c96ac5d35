"""WorkChain computing one spectrum per value of a swept parameter."""

from aiida.engine import WorkChain, while_
from aiida.orm import ArrayData, Dict, Float, List, Str

from ..calculations.functions import compute_spectrum, sweep_point_parameters


class SpectrumSweepWorkChain(WorkChain):
    """
    WorkChain that sweeps one model parameter and computes the probe
    spectrum at every step.
    """

    @classmethod
    def define(cls, spec):
        super().define(spec)

        spec.input(
            "parameters",
            valid_type=Dict,
            help="Starting parameters, as in a run configuration.",
        )
        spec.input(
            "grid",
            valid_type=Dict,
            help="Probe-detuning grid with keys min, max and count.",
        )
        spec.input(
            "axis",
            valid_type=Str,
            help="Name of the swept parameter.",
        )
        spec.input(
            "values",
            valid_type=List,
            help="Swept values in SI units.",
        )
        spec.input(
            "tie",
            valid_type=Str,
            default=lambda: Str("none"),
            help="Constraint applied at every step: none, line or es.",
        )

        spec.outline(
            cls.setup,
            while_(cls.has_next)(
                cls.run_point,
                cls.inspect_point,
            ),
            cls.finalize,
        )

        spec.output_namespace("spectra", valid_type=ArrayData, dynamic=True)
        spec.output_namespace("steady_states", valid_type=Dict, dynamic=True)

        spec.exit_code(
            400,
            "ERROR_EMPTY_SWEEP",
            message="The sweep has no values.",
        )
        spec.exit_code(
            410,
            "ERROR_SWEEP_POINT_FAILED",
            message="Sweep step {step} ({axis} = {value}) failed: {reason}",
        )

    def setup(self):
        self.ctx["values"] = [float(value) for value in self.inputs["values"].get_list()]
        self.ctx.step = 0
        if not self.ctx["values"]:
            return self.exit_codes.ERROR_EMPTY_SWEEP
        self.report(f"Sweeping {self.inputs.axis.value} over {len(self.ctx['values'])} values.")

    def has_next(self):
        return self.ctx.step < len(self.ctx["values"])

    def run_point(self):
        """Build the step parameters and compute its spectrum."""
        value = self.ctx["values"][self.ctx.step]
        parameters, node = sweep_point_parameters.run_get_node(
            self.inputs.parameters, self.inputs.axis, Float(value), self.inputs.tie
        )
        self.ctx.failed = None if node.is_finished_ok else node
        if self.ctx.failed is None:
            self.ctx.result, self.ctx.failed = self._spectrum(parameters)

    def _spectrum(self, parameters):
        result, node = compute_spectrum.run_get_node(parameters, self.inputs.grid)
        return result, None if node.is_finished_ok else node

    def inspect_point(self):
        """Verify the step finished and attach its outputs."""
        step, value = self.ctx.step, self.ctx["values"][self.ctx.step]
        node = self.ctx.failed
        if node is not None:
            self.report(f"step {step} failed with exit status {node.exit_status}")
            return self.exit_codes.ERROR_SWEEP_POINT_FAILED.format(
                step=step,
                axis=self.inputs.axis.value,
                value=value,
                reason=node.exit_message,
            )
        self.out(f"spectra.step_{step}", self.ctx.result["spectrum"])
        self.out(f"steady_states.step_{step}", self.ctx.result["steady_state"])
        self.ctx.step += 1

    def finalize(self):
        self.report(f"Sweep finished: {self.ctx.step} spectra.")

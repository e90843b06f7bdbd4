"""edgeflow: discrete-time simulator and cost metrics for edge-first LM inference."""

__version__ = "0.1.0"

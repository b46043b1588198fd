"""
cvwitness Metrics Module

Prometheus metrics for sampling and witness evaluation. Runs are batch jobs, so the
registry is written to a textfile (node-exporter textfile collector format) instead of
being served over HTTP.
"""

from pathlib import Path

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

from cvwitness.logger import WitnessLogger

logger = WitnessLogger.get_logger("metrics")


class WitnessMetrics:
    """
    Metrics collected during a cvwitness run.

    Each instance owns a private CollectorRegistry so tests and repeated CLI
    invocations in one process never collide on metric names.
    """

    def __init__(self) -> None:
        self.registry = CollectorRegistry()

        # Sampling metrics
        self.samples_accepted = Counter(
            "cvwitness_samples_accepted_total",
            "Samples accepted by the signed-mixture rejection sampler",
            ["layout"],
            registry=self.registry,
        )
        self.proposals_drawn = Counter(
            "cvwitness_proposals_drawn_total",
            "Proposals drawn from the envelope mixture",
            ["layout"],
            registry=self.registry,
        )
        self.acceptance_rate = Gauge(
            "cvwitness_acceptance_rate",
            "Acceptance rate of the most recent sampling run",
            ["layout"],
            registry=self.registry,
        )

        # Witness metrics
        self.witness_evaluations = Counter(
            "cvwitness_witness_evaluations_total",
            "Witness evaluations by criterion",
            ["criterion"],
            registry=self.registry,
        )
        self.witness_duration_seconds = Histogram(
            "cvwitness_witness_duration_seconds",
            "Time to assemble cumulants and evaluate one witness",
            ["criterion"],
            buckets=[1e-4, 5e-4, 1e-3, 5e-3, 0.01, 0.05, 0.1, 0.5, 1.0],
            registry=self.registry,
        )
        self.threshold_evaluations = Counter(
            "cvwitness_threshold_evaluations_total",
            "Margin evaluations performed by threshold bisection",
            registry=self.registry,
        )

    def record_sampling(self, layout: str, accepted: int, proposed: int) -> None:
        """
        Record one sampling run.

        Args:
            layout: Sample layout label (xx, pp, het1, het2, or 'mixture')
            accepted: Number of accepted samples kept
            proposed: Number of proposals drawn
        """
        self.samples_accepted.labels(layout=layout).inc(accepted)
        self.proposals_drawn.labels(layout=layout).inc(proposed)
        if proposed:
            self.acceptance_rate.labels(layout=layout).set(accepted / proposed)

    def write(self, path: str | Path) -> None:
        """
        Write the registry in Prometheus text format.

        Args:
            path: Destination file path
        """
        write_to_textfile(str(path), self.registry)
        logger.debug(f"Metrics written to {path}")


_metrics: WitnessMetrics | None = None


def get_metrics() -> WitnessMetrics:
    """Return the process-wide metrics instance, creating it on first use."""
    global _metrics
    if _metrics is None:
        _metrics = WitnessMetrics()
    return _metrics


def reset_metrics() -> None:
    """Discard the process-wide metrics instance."""
    global _metrics
    _metrics = None

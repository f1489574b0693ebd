"""Pydantic schemas for parameters, configurations and reports."""

from wlandelay.schemas.dcf import DcfParams, FixedPointSolution, SlotModel, ThroughputPoint
from wlandelay.schemas.experiment import (
    Command,
    ComparisonRow,
    ConfigFile,
    ExperimentSpec,
    SimulationSection,
    SweepRow,
    TableResult,
)
from wlandelay.schemas.polling import DelayReport, PollingConfig
from wlandelay.schemas.simulation import (
    DcfSimConfig,
    DcfSimReport,
    Distribution,
    PollingMode,
    PollingSimConfig,
    PollingSimReport,
    TrafficMode,
)

__all__ = [
    "Command",
    "ComparisonRow",
    "ConfigFile",
    "DcfParams",
    "DcfSimConfig",
    "DcfSimReport",
    "DelayReport",
    "Distribution",
    "ExperimentSpec",
    "FixedPointSolution",
    "PollingConfig",
    "PollingMode",
    "PollingSimConfig",
    "PollingSimReport",
    "SimulationSection",
    "SlotModel",
    "SweepRow",
    "TableResult",
    "ThroughputPoint",
    "TrafficMode",
]

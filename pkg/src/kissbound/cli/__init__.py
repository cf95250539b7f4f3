"""Command-line pipelines and certificate output."""

from .certificate import Certificate, Check, fmt, run_pipeline
from .pipelines import AngleBound, angle_bound, certify_angle, delsarte, extension_pipeline, plot_data, verify_k3, verify_k4, write_csv

__all__ = [
    "Certificate",
    "Check",
    "fmt",
    "run_pipeline",
    "AngleBound",
    "angle_bound",
    "certify_angle",
    "delsarte",
    "extension_pipeline",
    "plot_data",
    "verify_k3",
    "verify_k4",
    "write_csv",
]

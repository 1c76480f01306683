"""Figure renderer for photonmix sweep tables."""

from .render import PlotJob, SchemaError, render

__version__ = "0.1.0"

"""Reconstruct social-media reshare cascades from platform logs and measure
how reconstruction choices reshape cascade topology and node influence."""

__version__ = "0.1.0"

"""Converter admittance workbench.

Synthesizes dq-frame admittance spectra for grid-connected converters under
GFM and GFL control, validates a PRBS injection measurement against the
analytical small-signal models, and classifies the control mode from
admittance features with from-scratch learners.
"""

__version__ = "0.1.0"

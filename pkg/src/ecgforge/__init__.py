"""ecgforge: 12-lead ECG denoising, heartbeat segmentation, GAN-based
lead-to-lead reconstruction, and evaluation tooling."""

__version__ = "0.1.0"

"""Index codes over AWGN broadcast channels with set-partitioned PSK/QAM labelings."""

__version__ = "0.1.0"

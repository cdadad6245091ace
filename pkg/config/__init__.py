"""Configuration module for the cavity spin memory simulator."""

from config.settings import Settings, settings

__all__ = ["Settings", "settings"]

"""Bundled reproduction presets; load them via cavmag.config.load_preset."""

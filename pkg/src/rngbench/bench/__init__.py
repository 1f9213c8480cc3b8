"""Config-driven benchmark orchestration and CLI."""

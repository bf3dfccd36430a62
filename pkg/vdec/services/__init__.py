"""Services Package."""

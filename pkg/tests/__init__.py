"""BOM Test Suite."""

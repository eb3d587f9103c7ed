"""Result aggregation and plot data."""

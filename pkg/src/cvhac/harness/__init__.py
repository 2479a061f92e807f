"""Monte Carlo engine, eigen-adjustment analyses, empirical pipeline and CLI."""

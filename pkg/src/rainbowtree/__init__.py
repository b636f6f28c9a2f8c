"""Rainbow spanning trees in randomly colored random subgraphs of dense regular graphs."""

__version__ = "0.1.0"

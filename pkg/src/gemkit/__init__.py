"""Combinatorial toolkit for 3-gems: moves, twistors, gray graphs, resolutions and J²-gems."""

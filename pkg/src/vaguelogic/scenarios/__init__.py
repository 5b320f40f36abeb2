"""Worked models: the sweetness sensor, the heap, and heights with estimates."""

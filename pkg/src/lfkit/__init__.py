"""lfkit: weak-supervision labeling for long documents.

Pipeline: ingest documents and enrich them with token metadata, evaluate
labeling functions written in a small pattern DSL, aggregate the resulting
votes into training labels, and score them against gold spans.
"""

__version__ = "0.1.0"

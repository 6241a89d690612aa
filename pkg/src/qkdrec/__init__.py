"""Secret-key reconciliation toolkit for discrete-variable QKD.

Two reconciliation schemes over the binary symmetric channel -- the
interactive Cascade protocol and one-way LDPC syndrome coding -- plus the
density-evolution machinery to design and certify the LDPC ensembles and
the secret-key-rate metrics that compare them.
"""

__version__ = "0.1.0"

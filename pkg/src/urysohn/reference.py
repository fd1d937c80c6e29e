"""Reference sup-norm errors for the reciprocal-kernel problem.

Keyed by ``(c, r)``; rows are labelled by ``N`` in ``REFERENCE_LABELS``. See
:func:`urysohn.study.reference_layout` for the discretisation each label
stands for.
"""

REFERENCE_LABELS = (2, 4, 8, 16, 32)

REFERENCE_ERRORS = {
    (1.0, 1): {
        "modified": (8.46e-4, 1.03e-4, 1.24e-5, 1.45e-6, 1.59e-7),
        "iterated_modified": (2.38e-5, 1.37e-6, 8.18e-8, 4.99e-9, 3.08e-10),
    },
    (1.0, 2): {
        "modified": (5.06e-4, 1.07e-5, 1.85e-7, 3.07e-9, 4.74e-11),
        "iterated_modified": (6.47e-5, 2.09e-7, 8.45e-10, 3.35e-12, 1.34e-14),
    },
    (0.1, 1): {
        "modified": (3.64e-4, 6.29e-5, 6.85e-6, 1.12e-6, 1.27e-7),
        "iterated_modified": (7.80e-6, 4.20e-7, 2.42e-8, 1.45e-9, 8.89e-11),
    },
    (0.1, 2): {
        "modified": (9.39e-5, 1.19e-4, 3.30e-6, 4.99e-8, 7.00e-10),
        "iterated_modified": (1.14e-4, 2.84e-7, 1.10e-9, 4.35e-12, 1.78e-14),
    },
}

REFERENCE_EOC = {
    (1.0, 1): {
        "modified": (3.04, 3.05, 3.09, 3.19),
        "iterated_modified": (4.12, 4.07, 4.04, 4.02),
    },
    (1.0, 2): {
        "modified": (5.56, 5.86, 5.90, 6.02),
        "iterated_modified": (8.27, 7.95, 7.98, 7.96),
    },
    (0.1, 1): {
        "modified": (2.53, 2.83, 2.99, 3.14),
        "iterated_modified": (4.21, 4.12, 4.06, 4.03),
    },
    (0.1, 2): {
        "modified": (-0.35, 5.18, 6.05, 6.16),
        "iterated_modified": (8.65, 8.01, 7.99, 7.93),
    },
}

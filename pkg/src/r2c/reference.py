"""Previously published R2C results on two benchmark datasets, carried into run
reports so a new run can be compared with them side by side.

Confusion matrices are cluster (rows) by class (columns).
"""

PUBLISHED = {
    "banknote": {
        "n": 200,
        "d": 6,
        "policy": "plateau",
        "u_selected": 0.36,
        "final_k": 2,
        "k_per_margin_range": [1, 3],
        "classes": ["counterfeit", "genuine"],
        "confusion_r2c": [[99, 0], [1, 100]],
        "confusion_gmm": [[16, 2], [0, 98], [84, 0]],
        "marginal_fitting": "non-local-prior mixtures",
    },
    "wine": {
        "n": 178,
        "d": 13,
        "policy": "plateau",
        "u_selected": 0.105,
        "final_k": 3,
        "k_per_margin_counts": {"1": 8, "2": 5},
        "classes": ["Barbera", "Grignolino", "Barolo"],
        "confusion_r2c": [[42, 9, 5], [1, 56, 16], [5, 7, 37]],
        "confusion_gmm": [[0, 27, 59], [48, 44, 0]],
        "marginal_fitting": "non-local-prior mixtures",
    },
}

"""House bounds for reciprocal algebraic integers and slit-set potential theory."""

import pytest


def format_row(alpha, revenue, ope_mse):
    cells = [repr(float(a)) for a in alpha]
    cells += [repr(float(revenue)), repr(float(ope_mse)), repr(float(alpha[0]))]
    return ",".join(cells)


def write_points(path, rows, k=None):
    """Write a conforming CSV; rows are (alpha, revenue, ope_mse) triples."""
    k = k if k is not None else len(rows[0][0])
    header = ",".join([f"alpha_{i + 1}" for i in range(k)] + ["revenue", "ope_mse", "random_ratio"])
    lines = [header] + [format_row(*row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def sample_rows():
    return [
        ((0.0, 0.9, 0.1), 0.700, 0.31),
        ((0.1, 0.8, 0.1), 0.693, 0.002),
        ((0.4, 0.4, 0.2), 0.670, 0.0007),
        ((1.0, 0.0, 0.0), 0.625, 0.0004),
    ]

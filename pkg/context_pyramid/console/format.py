from rich.table import Table

from .pretty import pretty_print


def tabulate(
    header: list[str] | None = None,
    rows: list[list[str]] | None = None,
    *,
    title: str | None = None,
    numeric: set[int] | None = None,
) -> None:
    """Print a table built from a header and rows

    Args:
        header: The table header
        rows: The table rows
        title: Optional caption printed above the table
        numeric: Indices of columns to right-justify
    """
    table = Table(title=title)
    if header:
        for index, item in enumerate(header):
            table.add_column(
                item, justify="right" if numeric and index in numeric else "left"
            )
    if rows:
        for row in rows:
            table.add_row(*row)

    pretty_print(table)

import csv
import io

from rest_framework.renderers import JSONRenderer


def serialize_rows(rows, serializer_class, digits):
    """Rows as plain dicts of decimal strings, in the serializer's field order."""
    serializer = serializer_class(rows, many=True, context={"digits": digits})
    return serializer.data


def render_rows(rows, serializer_class, output_format, digits):
    """
    Render result rows as CSV or JSON text.

    CSV has a header row; missing values are empty cells. JSON is a list of
    objects with the same keys and the same decimal strings.
    """
    data = serialize_rows(rows, serializer_class, digits)
    if output_format == "json":
        return JSONRenderer().render(data).decode() + "\n"
    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer, fieldnames=list(serializer_class().fields), lineterminator="\n"
    )
    writer.writeheader()
    writer.writerows(data)
    return buffer.getvalue()


def render_error(code, message):
    return JSONRenderer().render({"error_code": code, "message": message}).decode()

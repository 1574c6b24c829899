from m2v.htmlnorm import normalize_html
from m2v.manual import parse_markdown


def test_bold_paragraph():
    assert normalize_html("<p>Click <b>OK</b></p>").strip() == "Click **OK**"


def test_ordered_list():
    assert normalize_html("<ol><li>Open menu</li></ol>").strip() == "1. Open menu"


def test_ordered_list_counts():
    out = normalize_html("<ol><li>one</li><li>two</li></ol>")
    assert out.strip().splitlines() == ["1. one", "", "2. two"]


def test_unknown_tags_strip_to_text():
    assert normalize_html("<div><span>hello</span></div>").strip() == "hello"


def test_strong_em_i_code_img():
    html = (
        '<p><strong>A</strong> <em>B</em> <i>C</i> <code>x &lt; y</code>'
        ' <img src="pic.ppm" alt="shot"></p>'
    )
    out = normalize_html(html).strip()
    assert out == "**A** **B** **C** `x < y` ![shot](pic.ppm)"


def test_headings_map():
    assert normalize_html("<h2>Setup</h2>").strip() == "## Setup"


def test_script_content_dropped():
    out = normalize_html("<p>keep</p><script>var x = '<';</script>")
    assert out.strip() == "keep"


def test_no_angle_bracket_outside_code():
    html = "<p>press &lt;Enter&gt; then <code>a&lt;b</code></p>"
    out = normalize_html(html)
    blocks = parse_markdown(out)
    # raw '<' may only survive inside the code span
    from m2v.manual import CodeSpan, Paragraph

    assert isinstance(blocks[0], Paragraph)
    for inline in blocks[0].inlines:
        if not isinstance(inline, CodeSpan):
            assert "<" not in getattr(inline, "text", "")


def test_output_feeds_markdown_parser():
    html = "<ol><li>Click <b>Next</b></li><li>Type <code>run me</code></li></ol>"
    blocks = parse_markdown(normalize_html(html))
    from m2v.manual import CodeSpan, Emphasis, Step

    assert isinstance(blocks[0], Step) and Emphasis("Next") in blocks[0].inlines
    assert isinstance(blocks[1], Step) and CodeSpan("run me") in blocks[1].inlines

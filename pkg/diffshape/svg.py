# -*- coding: utf-8 -*-
"""
diffshape/svg
~~~~~~~~~~~~~

A small SVG writer for the mutual-information-versus-SNR chart of a sweep.
One polyline is drawn per ``(scheme, channel)`` series.
"""
import collections
from xml.sax.saxutils import escape, quoteattr

#: Stroke colours, cycled through by series.
PALETTE = (
    '#1f77b4', '#d62728', '#2ca02c', '#ff7f0e', '#9467bd', '#8c564b',
)


class SvgDocument(object):
    """
    Accumulates SVG elements as text.
    """
    def __init__(self, width, height):
        self.width = width
        self.height = height
        self._parts = []

    def line(self, x1, y1, x2, y2, stroke='#000000', width=1.0):
        self._parts.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="%s" '
            'stroke-width="%.1f"/>' % (x1, y1, x2, y2, stroke, width)
        )

    def polyline(self, points, stroke, series):
        coords = ' '.join('%.2f,%.2f' % p for p in points)
        self._parts.append(
            '<polyline points="%s" fill="none" stroke="%s" '
            'stroke-width="2" data-series=%s/>' %
            (coords, stroke, quoteattr(series))
        )

    def text(self, x, y, content, anchor='start', size=12):
        self._parts.append(
            '<text x="%.2f" y="%.2f" font-size="%d" text-anchor="%s" '
            'font-family="sans-serif">%s</text>' %
            (x, y, size, anchor, escape(content))
        )

    def render(self):
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            'width="%d" height="%d" viewBox="0 0 %d %d">\n' %
            (self.width, self.height, self.width, self.height) +
            ''.join(part + '\n' for part in self._parts) +
            '</svg>\n'
        )


def _series(results):
    series = collections.OrderedDict()
    for r in sorted(results, key=lambda r: (r.scheme, r.channel, r.snr_db)):
        series.setdefault('%s/%s' % (r.scheme, r.channel), []).append(
            (r.snr_db, r.mi_bits)
        )
    return series


def mi_chart(results, width=640, height=420, title=None):
    """
    Renders sweep results as an SVG line chart of mutual information (bits)
    against SNR (dB).

    :param results: :class:`PointResult
        <diffshape.experiment.PointResult>` rows.
    :rtype: ``str``
    """
    series = _series(results)
    left, right, top, bottom = 60.0, 160.0, 40.0, 50.0
    plot_w = width - left - right
    plot_h = height - top - bottom

    snrs = [s for points in series.values() for s, _ in points] or [0.0]
    mis = [m for points in series.values() for _, m in points] or [0.0]
    x_lo, x_hi = min(snrs), max(snrs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    y_hi = max(1.0, max(mis) * 1.05)

    def sx(v):
        return left + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v):
        return top + plot_h - v / y_hi * plot_h

    doc = SvgDocument(width, height)
    doc.text(width / 2.0, 24, title or 'Mutual information vs. SNR',
             anchor='middle', size=14)
    doc.line(left, top + plot_h, left + plot_w, top + plot_h)
    doc.line(left, top, left, top + plot_h)

    for snr in sorted(set(snrs)):
        doc.line(sx(snr), top + plot_h, sx(snr), top + plot_h + 5)
        doc.text(sx(snr), top + plot_h + 18, '%g' % snr, anchor='middle')
    for k in range(5):
        value = y_hi * k / 4.0
        doc.line(left - 5, sy(value), left, sy(value))
        doc.text(left - 8, sy(value) + 4, '%.2f' % value, anchor='end')
    doc.text(left + plot_w / 2.0, height - 12, 'SNR (dB)', anchor='middle')
    doc.text(16, top - 12, 'MI (bits)')

    for k, (name, points) in enumerate(series.items()):
        colour = PALETTE[k % len(PALETTE)]
        doc.polyline([(sx(s), sy(m)) for s, m in points], colour, name)
        legend_y = top + 16 * k + 8
        doc.line(left + plot_w + 12, legend_y, left + plot_w + 32, legend_y,
                 stroke=colour, width=2.0)
        doc.text(left + plot_w + 38, legend_y + 4, name)
    return doc.render()

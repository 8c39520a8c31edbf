"""Exact accounting of simulated client-server traffic."""
import collections
import logging

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

DIRECTIONS = ('up', 'down')
LEDGER_COLUMNS = ['round', 'direction', 'client_id', 'floats', 'integers',
                  'method']

LedgerEvent = collections.namedtuple('LedgerEvent', LEDGER_COLUMNS)


class FederationError(Exception):
    """A client or a federated round failed."""


class CommLedger:
    """Append-only log of float32 (and integer) transfers.

    Events are kept in recording order; :attr:`events` returns them
    sorted by ``(round, client_id, direction)`` so that reports do not
    depend on the order in which parallel clients finished.
    """

    def __init__(self, events=()):
        self._events = []
        for event in events:
            self.record(*event)

    def record(self, round_number, direction, client_id, floats, integers=0,
               method=''):
        """Append one transfer."""
        if direction not in DIRECTIONS:
            raise ValueError("Unknown direction '{}', choose from: {}".format(
                direction, ', '.join(DIRECTIONS)))
        for name, count in (('floats', floats), ('integers', integers)):
            if int(count) != count or count < 0:
                raise ValueError(
                    "{} should be a non-negative integer, not {}".format(
                        name, count))
        event = LedgerEvent(int(round_number), direction, int(client_id),
                            int(floats), int(integers), str(method))
        self._events.append(event)
        return event

    def extend(self, other):
        """Append all events of another ledger."""
        for event in other.raw_events:
            self.record(*event)

    @property
    def raw_events(self):
        return list(self._events)

    @property
    def events(self):
        return sorted(self._events,
                      key=lambda e: (e.round, e.client_id, e.direction,
                                     e.method))

    def __len__(self):
        return len(self._events)

    def select(self, method=None, direction=None):
        """Return the sorted events matching a method and a direction."""
        return [
            event for event in self.events
            if (method is None or event.method == method) and (
                direction is None or event.direction == direction)
        ]

    def total_floats(self, method=None, direction=None):
        return sum(event.floats for event in self.select(method, direction))

    def total_integers(self, method=None, direction=None):
        return sum(event.integers
                   for event in self.select(method, direction))

    def cumulative_floats(self, method=None):
        """Return a mapping from round to floats sent up to that round."""
        totals = collections.OrderedDict()
        running = 0
        for event in self.select(method):
            running += event.floats
            totals[event.round] = running
        return totals

    def methods(self):
        return sorted({event.method for event in self._events})

    def to_frame(self):
        return pd.DataFrame(self.events, columns=LEDGER_COLUMNS)

    def save(self, filename):
        """Write the sorted events as CSV."""
        self.to_frame().to_csv(filename, index=False)

    @classmethod
    def load(cls, filename):
        frame = pd.read_csv(filename, keep_default_na=False)
        return cls(frame[LEDGER_COLUMNS].itertuples(index=False, name=None))

    def summary(self):
        """Return per-method totals as a dict."""
        return {
            method: {
                'floats_up': self.total_floats(method, 'up'),
                'floats_down': self.total_floats(method, 'down'),
                'integers_up': self.total_integers(method, 'up'),
                'events': len(self.select(method)),
            }
            for method in self.methods()
        }

    def __eq__(self, other):
        return isinstance(other, CommLedger) and self.events == other.events

    def __repr__(self):
        return "CommLedger({} events, {} floats)".format(
            len(self), self.total_floats())


def comm_totals(ledger, method=None, direction=None):
    """Return the exact number of float32s a method communicated.

    >>> ledger = CommLedger()
    >>> comm_totals(ledger)
    0
    """
    return ledger.total_floats(method, direction)


def floats_to_reach(trace, metric, threshold, higher_is_better=True):
    """Return the communication needed for a metric to cross a threshold.

    Parameters
    ----------
    trace: :obj:`pandas.DataFrame` or list of dict
        Per-round records with at least the columns ``round``,
        ``floats_cum`` and `metric`.
    metric: str
        Column to test.
    threshold: float
        Level to reach.
    higher_is_better: bool
        Whether the metric has to rise to at least `threshold` (accuracy)
        or fall to at most `threshold` (NLL, RMSE, ECE).

    Returns
    -------
    int or None
        ``floats_cum`` of the first round (in round order) that crosses
        the threshold, None if no round does.
    """
    frame = pd.DataFrame(trace)
    if frame.empty:
        return None
    frame = frame.sort_values('round', kind='mergesort')
    values = frame[metric].to_numpy(dtype=np.float64)
    if higher_is_better:
        crossed = values >= threshold
    else:
        crossed = values <= threshold
    if not crossed.any():
        return None
    first = int(np.argmax(crossed))
    return int(frame['floats_cum'].iloc[first])

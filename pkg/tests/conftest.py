import copy

import numpy as np
import pytest

from hubopt.instance import instance_from_dict, load_bundled
from hubopt.milp import SolveOptions

HIGHS = SolveOptions(backend="highs")


def toy_doc(nt=3, load=(10.0, 12.0, 8.0), price=(50.0, 60.0, 40.0), pv=None, wind=None):
    """A small single-year hub document: one grid segment, electrolyzer, empty storages."""
    load = list(load)[:nt] + [0.0] * max(0, nt - len(load))
    price = list(price)[:nt] + [price[-1]] * max(0, nt - len(price))
    zero = [[0.0] * nt]
    empty = {"e_min": 0.0, "e_max": 0.0, "p_ch_max": 0.0, "p_dch_max": 0.0,
             "eta_ch": 1.0, "eta_dch": 1.0, "e_init": 0.0}
    return {
        "schema": "hubopt/1",
        "name": "toy",
        "time": {"years": [2025], "periods_per_year": nt, "period_duration_h": 1.0},
        "segments": [{"name": "hydro", "max_purchase_MW": 100.0, "price_per_MWh": 0.0}],
        "techs": [{"kind": "electrolyzer", "efficiency": 0.75, "max_input_per_period": 0.0}],
        "storages": [dict(empty, carrier="heat"), dict(empty, carrier="hydrogen")],
        "demands": {"electricity_MWh": [load], "heat_MWh": zero, "cooling_MWh": zero,
                    "ev_MWh": zero, "hv_MWh": zero},
        "renewables": {"pv_MW": [list(pv)] if pv else zero,
                       "wind_MW": [list(wind)] if wind else zero},
        "policy": {"mode": "none"},
        "prices": {"buy_per_MWh": [price], "sell_per_MWh": zero},
        "export_limit_MW": 0.0,
        "fuel_emission_coeff": 0.2,
    }


def toy_instance(**kw):
    return instance_from_dict(toy_doc(**kw))


def edit(doc, fn):
    d = copy.deepcopy(doc)
    fn(d)
    return instance_from_dict(d)


@pytest.fixture(scope="session")
def bundled():
    return load_bundled("synthetic_on.json")


@pytest.fixture(scope="session")
def bundled_long():
    return load_bundled("synthetic_on_long.json")


@pytest.fixture(scope="session")
def highs():
    return HIGHS


@pytest.fixture
def rng():
    return np.random.default_rng(7)

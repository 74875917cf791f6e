from __future__ import annotations

import pytest

from sayable import resources
from sayable.phonetics import build_embedding, load_pronouncing_dict

# A small controlled dictionary used by most unit tests. The layout mirrors
# the real file: comments, stress digits, alternate pronunciations.
TINY_DICT = """\
;;; test dictionary
BAT  B AE1 T
BEACH  B IY1 CH
BRISK  B R IH1 S K
CAT  K AE1 T
CHAIR  CH EH1 R
CLOSE  K L OW1 S
CLOSE(2)  K L OW1 Z
COUNTRY  K AH1 N T R IY0
CRANE  K R EY1 N
DOG  D AO1 G
FISH  F IH1 SH
GRAND  G R AE1 N D
GRAPH  G R AE1 F
GREEN  G R IY1 N
GRILL  G R IH1 L
GROUP  G R UW1 P
GROVE  G R OW1 V
HORSE  HH AO1 R S
HOUSE  HH AW1 S
KITE  K AY1 T
MADE  M EY1 D
MOUSE  M AW1 S
NATION  N EY1 SH AH0 N
OWL  AW1 L
SCOLD  S K OW1 L D
STATE  S T EY1 T
STREET  S T R IY1 T
TABLE  T EY1 B AH0 L
THE  DH AH0
WATER  W AO1 T ER0
"""


@pytest.fixture(scope="session")
def tiny_dict_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("dict") / "tiny-dict.txt"
    path.write_text(TINY_DICT, encoding="ascii")
    return path


@pytest.fixture(scope="session")
def tiny_dict(tiny_dict_path):
    return load_pronouncing_dict(tiny_dict_path)


@pytest.fixture(scope="session")
def tiny_embedding(tiny_dict):
    return build_embedding(tiny_dict)


@pytest.fixture(scope="session")
def full_dict():
    return load_pronouncing_dict(resources.bundled_dict_path())


@pytest.fixture(scope="session")
def full_embedding(full_dict):
    return build_embedding(full_dict)

#!/usr/bin/env python3
"""Regenerates porter_voc.txt / porter_output.txt.

Vocabulary: every 10th purely alphabetic word of Webster's 2nd (via the
english-words package) plus a handful of classic Porter examples.
Expected stems: NLTK PorterStemmer in MARTIN_EXTENSIONS mode, which matches
Martin Porter's reference C implementation on his published test vocabulary.

    pip install nltk english-words
    python3 make_porter_fixture.py
"""
import os
import re

from english_words import get_english_words_set
from nltk.stem.porter import PorterStemmer

EXTRA = """caresses ponies ties caress cats feed agreed plastered bled motoring
sing conflated troubled sized hopping tanned falling hissing fizzed failing
filing happy sky relational conditional rational valenci hesitanci digitizer
conformabli radicalli differentli vileli analogousli vietnamization predication
operator feudalism decisiveness hopefulness callousness formaliti sensitiviti
sensibiliti triplicate formative formalize electriciti electrical hopeful
goodness revival allowance inference airliner gyroscopic adjustable defensible
irritant replacement adjustment dependent adoption homologou communism activate
angulariti homologous effective bowdlerize probate rate cease controll roll
generalizations oscillators banks bank jar jars generously""".split()

here = os.path.dirname(os.path.abspath(__file__))
words = sorted(w for w in get_english_words_set(["web2"], lower=True)
               if re.fullmatch("[a-z]+", w))
voc = sorted(set(words[::10] + EXTRA))
stemmer = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS)
with open(os.path.join(here, "porter_voc.txt"), "w") as f:
    f.write("\n".join(voc) + "\n")
with open(os.path.join(here, "porter_output.txt"), "w") as f:
    f.write("\n".join(stemmer.stem(w) for w in voc) + "\n")

"""Walk through the light normalization rules and the tokenizer.

Run:  python demos/01_normalization_and_tokens.py
"""

from stoplab import normalize, tokenize

samples = [
    ("hamza-carrying alef folds to bare alef", "أخبار"),
    ("alef-madda too", "آفاق"),
    ("diacritics and tatweel stripped", "قَـــالَ"),
    ("word-final alef-maqsura becomes yeh", "مستشفى"),
    ("word-final teh-marbuta becomes heh", "مدرسة"),
    ("medial forms are left alone", "قصة قصص"),
    ("Latin text passes through", "TREC-2001 results"),
]

print("normalization")
print("-" * 60)
for label, text in samples:
    print("%-42s %r -> %r" % (label, text, normalize(text)))

print()
print("normalize is idempotent: applying it twice changes nothing")
for _, text in samples:
    once = normalize(text)
    assert normalize(once) == once
print("checked on all samples above")

print()
print("tokenization")
print("-" * 60)
for text in ["قال الوزير اليوم", "TREC-2001", "TREC2001", "نتائج 2001 الأولى"]:
    print("%r -> %r" % (text, tokenize(normalize(text))))
print()
print("tokens are runs of Arabic letters or Latin alphanumerics;")
print("everything else separates, so hyphens split but mixed")
print("letter-digit runs stay whole.")

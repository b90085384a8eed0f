words = "the quick brown fox".split()
lengths = []
for w in (x.upper() for x in words):
    lengths.append(len(w))
print(lengths)

argv = ["prog", "a.json", "b.json", "c.json"]

def load(*names):
    return "+".join(names)

dicts = load(argv[1], argv[2], argv[3])
print(dicts)

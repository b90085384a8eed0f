class Stats:
    def __init__(self, data):
        self.data = data

    def evens(self):
        out = []
        for v in self.data:
            if v % 2 == 0:
                out.append(v)
        return out

    def window(self, lo, hi):
        return [v for v in self.data if v >= lo and v < hi]

s = Stats(list(range(12)))
print(s.evens(), s.window(3, 7))

f = d[0]
d[0] = d[e]
d[e] = f

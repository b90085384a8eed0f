d[0], d[e] = d[e], d[0]

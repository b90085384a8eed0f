for e_0, e_1, *e in sales:
    a = e_0, e_1

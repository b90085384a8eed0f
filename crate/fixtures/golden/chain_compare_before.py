i > n1 and i <= n1 + n2

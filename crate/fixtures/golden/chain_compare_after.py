n1 < i <= n1 + n2

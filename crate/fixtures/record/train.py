import torch


# training setup note 3
# training setup note 4
# training setup note 5
# training setup note 6
# training setup note 7
# training setup note 8
# training setup note 9
# training setup note 10
# training setup note 11
# training setup note 12
# training setup note 13
# training setup note 14
# training setup note 15
# training setup note 16
# training setup note 17
# training setup note 18
# training setup note 19
# training setup note 20
# training setup note 21
# training setup note 22
# training setup note 23
# training setup note 24
# training setup note 25
# training setup note 26
# training setup note 27
# training setup note 28
# training setup note 29
# training setup note 30
# training setup note 31
# training setup note 32
# training setup note 33
# training setup note 34
# training setup note 35
# training setup note 36
# training setup note 37
# training setup note 38
# training setup note 39
# training setup note 40
# training setup note 41
# training setup note 42
# training setup note 43
# training setup note 44
# training setup note 45
# training setup note 46
# training setup note 47
# training setup note 48
# training setup note 49
# training setup note 50
# training setup note 51
# training setup note 52
# training setup note 53
# training setup note 54
# training setup note 55
# training setup note 56
# training setup note 57
# training setup note 58
# training setup note 59
# training setup note 60
# training setup note 61
# training setup note 62
# training setup note 63
# training setup note 64
# training setup note 65
# training setup note 66
# training setup note 67
# training setup note 68
# training setup note 69
# training setup note 70
# training setup note 71
# training setup note 72
# training setup note 73
# training setup note 74
# training setup note 75
# training setup note 76
# training setup note 77
# training setup note 78
# training setup note 79
# training setup note 80
# training setup note 81
# training setup note 82
# training setup note 83
# training setup note 84
# training setup note 85
# training setup note 86
# training setup note 87
# training setup note 88
# training setup note 89
# training setup note 90
# training setup note 91
# training setup note 92
# training setup note 93
# training setup note 94
# training setup note 95
# training setup note 96
# training setup note 97
# training setup note 98
# training setup note 99
# training setup note 100
# training setup note 101
# training setup note 102
# training setup note 103
# training setup note 104
# training setup note 105
# training setup note 106
# training setup note 107
# training setup note 108
# training setup note 109
# training setup note 110
# training setup note 111
# training setup note 112
# training setup note 113
# training setup note 114
# training setup note 115
# training setup note 116
# training setup note 117
# training setup note 118
# training setup note 119
# training setup note 120
# training setup note 121
# training setup note 122
# training setup note 123
# training setup note 124
# training setup note 125
# training setup note 126
# training setup note 127
# training setup note 128
# training setup note 129
# training setup note 130
# training setup note 131
# training setup note 132
# training setup note 133
# training setup note 134
# training setup note 135
# training setup note 136
# training setup note 137
# training setup note 138
# training setup note 139
# training setup note 140
# training setup note 141
# training setup note 142
# training setup note 143
# training setup note 144
# training setup note 145
# training setup note 146
# training setup note 147
# training setup note 148
# training setup note 149
# training setup note 150
# training setup note 151
# training setup note 152
# training setup note 153
# training setup note 154
# training setup note 155
def train(loader, save_freq):
    iter_num = 0
    for batch in loader:
        iter_num += 1
        if iter_num % save_freq == 0:
            torch.save(batch, 'ckpt.pt')

game_board_height = 11
game_board_width = 11
num_simulations = 400
c_puct = 5
learning_rate = 2e-3
batch_size = 512
epochs = 5
kl_targ = 0.02
print(game_board_height * game_board_width, num_simulations, c_puct, learning_rate, batch_size, epochs, kl_targ)

print('kept')

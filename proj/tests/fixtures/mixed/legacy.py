print "python two"

# pmc command line

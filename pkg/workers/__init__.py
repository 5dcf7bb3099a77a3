# pmc workers

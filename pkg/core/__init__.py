# pmc core: settings, errors, artifact storage

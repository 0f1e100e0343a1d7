# Jobs package initialization
